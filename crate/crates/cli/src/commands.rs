use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use brushbot_core::regime1::{regime1_validity, Regime1Prediction};
use brushbot_core::regime2::{ground_speed_r2, peak_angle, simulate, Regime2Trajectory};
use brushbot_core::sweep::{refine_peak, run_sweep, Baseline, SweepResult};
use brushbot_core::{classify as classify_regime, Error};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("cannot write {}: {e}", path.display()))
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut line = serde_json::to_string(value).expect("report serializes");
    line.push('\n');
    line
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        ryu::Buffer::new().format_finite(v).to_string()
    } else {
        v.to_string()
    }
}

/// Formats an optional number for the text tables.
fn num(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), fmt_f64)
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$} {v}\n")).collect()
}

#[derive(Serialize)]
struct PredictReport {
    k_theta: f64,
    #[serde(rename = "I_theta")]
    i_theta: f64,
    omega_n: f64,
    t_bar: f64,
    omega_star: f64,
    theta_hat: f64,
    delta: f64,
    v_r: f64,
    regime1_valid: Option<bool>,
    margin: Option<f64>,
}

pub fn predict_r1(cfg: &RunConfig, json: bool) -> Result<String, CliError> {
    let brush = cfg.brush()?;
    let motor = cfg.motor()?;
    let p = Regime1Prediction::new(&brush, &motor)?;
    let validity = cfg.robot.map(|robot| regime1_validity(&motor, &robot));
    if p.beyond_geometry {
        eprintln!(
            "warning: stick angle {} rad exceeds alpha = {} rad; delta is outside the model geometry",
            p.stick_angle,
            brush.alpha()
        );
    }
    let report = PredictReport {
        k_theta: p.k_theta,
        i_theta: p.i_theta,
        omega_n: p.omega_n,
        t_bar: p.t_bar,
        omega_star: p.omega_star,
        theta_hat: p.theta_hat,
        delta: p.delta,
        v_r: p.v_r,
        regime1_valid: validity.map(|v| v.valid),
        margin: validity.map(|v| v.margin),
    };
    if json {
        Ok(json_line(&report))
    } else {
        Ok(table(&[
            ("k_theta", fmt_f64(report.k_theta)),
            ("I_theta", fmt_f64(report.i_theta)),
            ("omega_n", fmt_f64(report.omega_n)),
            ("t_bar", fmt_f64(report.t_bar)),
            ("omega_star", fmt_f64(report.omega_star)),
            ("theta_hat", fmt_f64(report.theta_hat)),
            ("delta", fmt_f64(report.delta)),
            ("v_r", fmt_f64(report.v_r)),
            (
                "regime1_valid",
                report.regime1_valid.map_or("n/a".into(), |b| b.to_string()),
            ),
            ("margin", num(report.margin)),
        ]))
    }
}

/// Space-separated trajectory table with a `t th thdot thddot x` header.
pub fn write_trajectory(traj: &Regime2Trajectory, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "t th thdot thddot x")?;
    for s in &traj.samples {
        writeln!(
            w,
            "{} {} {} {} {}",
            fmt_f64(s.t),
            fmt_f64(s.theta),
            fmt_f64(s.theta_dot),
            fmt_f64(s.theta_ddot),
            fmt_f64(s.x)
        )?;
    }
    w.flush()
}

#[derive(Serialize)]
struct SimulateReport {
    samples: usize,
    cycles: usize,
    peak_angle: Option<f64>,
    v_r_peak: Option<f64>,
    mean_v_r: f64,
    cycles_per_revolution: f64,
    final_x: f64,
}

pub fn simulate_r2(cfg: &RunConfig, out: &Path, json: bool) -> Result<String, CliError> {
    let robot = cfg.robot()?;
    let motor = cfg.motor()?;
    let sim = cfg.sim()?;
    let traj = simulate(&robot, &motor, &sim)?;

    let file = File::create(out).map_err(|e| io_error(out, e))?;
    write_trajectory(&traj, BufWriter::new(file)).map_err(|e| io_error(out, e))?;

    let peak = match peak_angle(&traj) {
        Ok(p) => Some(p),
        Err(Error::NoCycles) => None,
        Err(e) => return Err(e.into()),
    };
    let report = SimulateReport {
        samples: traj.samples.len(),
        cycles: traj.cycle_peaks.len(),
        peak_angle: peak,
        v_r_peak: peak.map(|p| ground_speed_r2(&robot, &motor, p)).transpose()?,
        mean_v_r: traj.mean_speed(),
        cycles_per_revolution: traj.cycles_per_revolution(),
        final_x: traj.final_x(),
    };
    if json {
        Ok(json_line(&report))
    } else {
        Ok(table(&[
            ("samples", report.samples.to_string()),
            ("cycles", report.cycles.to_string()),
            ("peak_angle", num(report.peak_angle)),
            ("v_r_peak", num(report.v_r_peak)),
            ("mean_v_r", fmt_f64(report.mean_v_r)),
            ("cycles_per_revolution", fmt_f64(report.cycles_per_revolution)),
            ("final_x", fmt_f64(report.final_x)),
        ]))
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    regime: String,
    lift_ratio: f64,
    stiffness_score: f64,
    alpha_margin: f64,
    rationale: Vec<String>,
}

pub fn classify(cfg: &RunConfig, json: bool) -> Result<String, CliError> {
    let report = classify_regime(&cfg.brush()?, &cfg.motor()?, &cfg.robot()?, &cfg.thresholds);
    let rationale: Vec<String> = report.rationale.iter().map(|c| c.to_string()).collect();
    if json {
        return Ok(json_line(&ClassifyReport {
            regime: report.regime.to_string(),
            lift_ratio: report.lift_ratio,
            stiffness_score: report.stiffness_score,
            alpha_margin: report.alpha_margin,
            rationale,
        }));
    }
    let mut text = format!(
        "regime: {}\nlift_ratio: {}\nstiffness_score: {}\nalpha_margin: {}\nrationale:\n",
        report.regime,
        fmt_f64(report.lift_ratio),
        fmt_f64(report.stiffness_score),
        fmt_f64(report.alpha_margin)
    );
    for line in rationale {
        text.push_str(&format!("  {line}\n"));
    }
    Ok(text)
}

/// `param,value,objective,status` rows in grid order, then comment lines;
/// the last line is always `# argmax=<value>`.
pub fn write_sweep_csv(result: &SweepResult, refined: Option<&str>, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "param,value,objective,status")?;
    for row in &result.rows {
        let objective = row.objective.map(fmt_f64).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{}",
            result.parameter,
            fmt_f64(row.value),
            objective,
            row.status
        )?;
    }
    if let Some(r) = refined {
        writeln!(w, "# refined={r}")?;
    }
    writeln!(w, "# argmax={}", num(result.argmax).replace("n/a", "none"))?;
    w.flush()
}

#[derive(Serialize)]
struct SweepReport {
    parameter: String,
    objective: String,
    rows: usize,
    ok_rows: usize,
    argmax: Option<f64>,
    refined: Option<f64>,
}

pub fn sweep(cfg: &RunConfig, out: &Path, json: bool) -> Result<String, CliError> {
    let section = cfg.sweep()?;
    let base = Baseline {
        brush: cfg.brush()?,
        motor: cfg.motor()?,
        robot: cfg.robot,
        sim: cfg.sim,
    };
    let result = run_sweep(&section.spec, &base)?;

    let refined = if section.refine {
        match refine_peak(&section.spec, &base, &result) {
            Ok(p) => Some(Ok(p.value)),
            Err(e @ (Error::EndpointArgmax { .. } | Error::Sweep(_))) => {
                eprintln!("warning: refinement skipped: {e}");
                Some(Err("endpoint"))
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let refined_text = refined.map(|r| r.map_or_else(|s| s.to_string(), fmt_f64));

    let file = File::create(out).map_err(|e| io_error(out, e))?;
    write_sweep_csv(&result, refined_text.as_deref(), BufWriter::new(file)).map_err(|e| io_error(out, e))?;

    let report = SweepReport {
        parameter: result.parameter.to_string(),
        objective: result.objective.to_string(),
        rows: result.rows.len(),
        ok_rows: result.rows.iter().filter(|r| r.objective.is_some()).count(),
        argmax: result.argmax,
        refined: refined.and_then(Result::ok),
    };
    if json {
        Ok(json_line(&report))
    } else {
        Ok(table(&[
            ("parameter", report.parameter.clone()),
            ("objective", report.objective.clone()),
            ("rows", report.rows.to_string()),
            ("ok_rows", report.ok_rows.to_string()),
            ("argmax", num(report.argmax)),
            ("refined", num(report.refined)),
        ]))
    }
}
