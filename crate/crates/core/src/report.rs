//! CSV and JSON emission. Floats are written with nine significant digits.

use std::io::Write;

use serde::Serialize;

use crate::decoherence::RatesRow;
use crate::optimizer::{RidgePoint, SurfaceCell};
use crate::pea::PeaCampaignResult;

pub type CsvResult = Result<(), csv::Error>;

/// Nine-significant-digit scientific notation.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.8e}")
}

fn writer<W: Write>(out: W, header: &[&str]) -> Result<csv::Writer<W>, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    w.write_record(header)?;
    Ok(w)
}

pub const RATES_HEADER: [&str; 7] = [
    "phi",
    "gamma1_cav_khz",
    "gamma1_ind_khz",
    "gamma1_cap_khz",
    "gammaphi_flux_exp_khz",
    "gammaphi_flux_gauss_khz",
    "gammaphi_curr_khz",
];

pub fn write_rates_csv<W: Write>(rows: &[RatesRow], out: W) -> CsvResult {
    let mut w = writer(out, &RATES_HEADER)?;
    for r in rows {
        w.write_record(
            [
                r.phi,
                r.gamma1_cav_khz,
                r.gamma1_ind_khz,
                r.gamma1_cap_khz,
                r.gammaphi_flux_exp_khz,
                r.gammaphi_flux_gauss_khz,
                r.gammaphi_curr_khz,
            ]
            .map(fmt_float),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub const SURFACE_HEADER: [&str; 3] = ["fq_max_ghz", "phi", "sensitivity_per_phi0"];

pub fn write_surface_csv<W: Write>(cells: &[SurfaceCell], out: W) -> CsvResult {
    let mut w = writer(out, &SURFACE_HEADER)?;
    for c in cells {
        w.write_record([c.f_q_max / 1e9, c.phi, c.sensitivity].map(fmt_float))?;
    }
    w.flush()?;
    Ok(())
}

pub const RIDGE_HEADER: [&str; 4] = [
    "temperature_mk",
    "fq_max_ghz",
    "phi_star",
    "sensitivity_per_phi0",
];

pub fn write_ridge_csv<W: Write>(points: &[RidgePoint], out: W) -> CsvResult {
    let mut w = writer(out, &RIDGE_HEADER)?;
    for p in points {
        w.write_record(
            [
                p.temperature * 1e3,
                p.f_q_max / 1e9,
                p.phi_star,
                p.sensitivity,
            ]
            .map(fmt_float),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub const CALIBRATION_HEADER: [&str; 2] = ["phi_ext", "probability"];

pub fn write_calibration_csv<W: Write>(fluxes: &[f64], probabilities: &[f64], out: W) -> CsvResult {
    let mut w = writer(out, &CALIBRATION_HEADER)?;
    for (f, p) in fluxes.iter().zip(probabilities) {
        w.write_record([*f, *p].map(fmt_float))?;
    }
    w.flush()?;
    Ok(())
}

pub const PEA_STEPS_HEADER: [&str; 7] = [
    "n_qubits",
    "step",
    "tau_bar_s",
    "accuracy_phi0",
    "mean_delay_s",
    "mean_measurements",
    "capped_runs",
];

/// Per-step campaign averages, one row per step.
pub fn aggregate_report<W: Write>(result: &PeaCampaignResult, out: W) -> CsvResult {
    let mut w = writer(out, &PEA_STEPS_HEADER)?;
    for s in &result.steps {
        w.write_record([
            result.config.n_qubits.to_string(),
            s.step.to_string(),
            fmt_float(s.tau_bar),
            fmt_float(s.accuracy),
            fmt_float(s.mean_delay),
            fmt_float(s.mean_measurements),
            s.capped_runs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const PEA_RUNS_HEADER: [&str; 10] = [
    "target",
    "repetition",
    "target_flux_phi0",
    "step",
    "tau_s",
    "theta_rad",
    "n_measurements",
    "capped",
    "estimate_phi0",
    "cumulative_time_s",
];

pub fn write_pea_runs_csv<W: Write>(result: &PeaCampaignResult, out: W) -> CsvResult {
    let mut w = writer(out, &PEA_RUNS_HEADER)?;
    for run in &result.runs {
        for (l, s) in run.steps.iter().enumerate() {
            w.write_record([
                run.target.to_string(),
                run.repetition.to_string(),
                fmt_float(run.target_flux),
                (l + 1).to_string(),
                fmt_float(s.tau),
                fmt_float(s.theta),
                s.n_measurements.to_string(),
                u8::from(s.capped).to_string(),
                fmt_float(s.estimate),
                fmt_float(s.cumulative_time),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")
}
