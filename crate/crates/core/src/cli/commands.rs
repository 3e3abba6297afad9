use serde::Serialize;

use super::manifest::Recorder;
use super::{
    BandsArgs, BoundaryArg, CheckArgs, Cli, Command, CompareHnArgs, Failure, SimulateArgs, SynthArgs,
    SynthMode, EXIT_FIDELITY, EXIT_INVALID, EXIT_OK, EXIT_UNREACHABLE,
};
use crate::control::{
    reachability_check, synthesize_unitary, verify_map, PulseCompiler, SynthesisTarget, REACHABILITY_TOL,
};
use crate::dynamics::{
    compare_hn, evolve, evolve_trajectory, uniform_q_grid, Chain, PulseSequence, ScalarSchedule, SpinorState,
};
use crate::error::{Error, Result};
use crate::model::{
    adiabatic_potentials, band_structure, franck_condon, gaussian_fc_ratio_for, wannier_on_grid, BlochSpectrum,
    LatticeConfig, Spin,
};
use crate::random::{random_scalar_schedule, rng};

const HN_TOL: f64 = 1e-8;

/// Like `println!`, but a closed stdout is not an error.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

pub(super) fn dispatch(cli: &Cli) -> std::result::Result<i32, Failure> {
    let (name, params) = match &cli.command {
        Command::Bands(a) => ("bands", to_value(a)),
        Command::Check(a) => ("check", to_value(a)),
        Command::Synth(a) => ("synth", to_value(a)),
        Command::Simulate(a) => ("simulate", to_value(a)),
        Command::CompareHn(a) => ("compare-hn", to_value(a)),
    };
    let params = serde_json::json!({ "seed": cli.seed, "tol": cli.tol, "args": params });
    let mut rec = Recorder::new(name, params, &cli.out_dir)?;
    let outcome = match &cli.command {
        Command::Bands(a) => bands(a, &mut rec),
        Command::Check(a) => check(cli, a, &mut rec),
        Command::Synth(a) => synth(cli, a, &mut rec),
        Command::Simulate(a) => simulate(a, &mut rec),
        Command::CompareHn(a) => compare(cli, a, &mut rec),
    };
    let code = match &outcome {
        Ok(code) => *code,
        Err(f) => f.code,
    };
    rec.finish(code)?;
    outcome
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn csv_bytes<F>(header: &[&str], fill: F) -> Result<Vec<u8>>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    fill(&mut w)?;
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn num(x: f64) -> String {
    format!("{x:.15e}")
}

/// A spinor state, or the Wannier column of a synthesis target.
fn parse_state(text: &str) -> Result<SpinorState> {
    match SpinorState::from_json(text) {
        Ok(s) => Ok(s),
        Err(first) => match serde_json::from_str::<SynthesisTarget>(text) {
            Ok(t) => t.to_state(),
            Err(_) => Err(first),
        },
    }
}

fn parse_target(text: &str) -> Result<SynthesisTarget> {
    match serde_json::from_str::<SynthesisTarget>(text) {
        Ok(t) => Ok(t),
        Err(first) => SpinorState::from_json(text)
            .map(|state| SynthesisTarget::Wannier { state })
            .map_err(|_| Error::Json(first)),
    }
}

fn lattice(theta_deg: f64, v0: Option<f64>, trap_freq: Option<f64>) -> Result<LatticeConfig> {
    let theta = theta_deg.to_radians();
    match (v0, trap_freq) {
        (_, Some(w)) => LatticeConfig::with_trap_frequency(theta, w),
        (Some(v), None) => LatticeConfig::new(v, theta),
        (None, None) => LatticeConfig::new(LatticeConfig::default().v0, theta),
    }
}

#[derive(Serialize)]
struct FcReport {
    schema: &'static str,
    theta_deg: f64,
    v0: f64,
    depth_up: f64,
    depth_down: f64,
    trap_freq_up: f64,
    bandwidth_up: f64,
    bandwidth_down: f64,
    /// `[re, im]` of `Omega_R / Omega_uw`.
    omega_right: [f64; 2],
    omega_left: [f64; 2],
    ratio: f64,
    gaussian_ratio: f64,
}

fn bands(a: &BandsArgs, rec: &mut Recorder) -> std::result::Result<i32, Failure> {
    let config = lattice(a.theta, a.v0, a.trap_freq)?;
    let up = band_structure(&config, Spin::Up, a.planewaves, a.qgrid)?;
    let down = band_structure(&config, Spin::Down, a.planewaves, a.qgrid)?;
    let n_bands = a.bands.min(up.n_bands());

    let table = csv_bytes(&["q [1/L]", "spin", "band", "energy [E_R]"], |w| {
        for s in [&up, &down] {
            let spin = if s.spin == Spin::Up { "up" } else { "down" };
            for (j, q) in s.q_grid.iter().enumerate() {
                for n in 0..n_bands {
                    w.write_record([num(*q), spin.into(), n.to_string(), num(s.bands[j][n])])?;
                }
            }
        }
        Ok(())
    })?;
    rec.write("bands.csv", &table)?;

    let grid: Vec<f64> = (0..=9 * 64).map(|i| -4.0 + i as f64 / 64.0).collect();
    let w_up = wannier_on_grid(&up, 0, 0, &grid)?;
    let w_down = wannier_on_grid(&down, 0, 0, &grid)?;
    let table = csv_bytes(
        &["z [L]", "up_re [L^-1/2]", "up_im [L^-1/2]", "down_re [L^-1/2]", "down_im [L^-1/2]"],
        |w| {
            for (i, z) in grid.iter().enumerate() {
                let (u, d) = (w_up.values[i], w_down.values[i]);
                w.write_record([num(*z), num(u.re), num(u.im), num(d.re), num(d.im)])?;
            }
            Ok(())
        },
    )?;
    rec.write("wannier.csv", &table)?;

    let z: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 / 100.0).collect();
    let dressed = adiabatic_potentials(&z, &config, a.delta, a.omega)?;
    let light = |s: Spin, z: f64| -config.depth(s) * (std::f64::consts::TAU * z + config.phase(s)).cos();
    let table = csv_bytes(
        &["z [L]", "v_up [E_R]", "v_down [E_R]", "v_plus [E_R]", "v_minus [E_R]"],
        |w| {
            for (i, &zi) in z.iter().enumerate() {
                w.write_record([
                    num(zi),
                    num(light(Spin::Up, zi)),
                    num(light(Spin::Down, zi)),
                    num(dressed.v_plus[i]),
                    num(dressed.v_minus[i]),
                ])?;
            }
            Ok(())
        },
    )?;
    rec.write("potentials.csv", &table)?;

    let report = fc_report(&config, &up, &down)?;
    say!(
        "theta {:.3} deg, V0 {:.6} E_R: |Omega_L/Omega_R| = {:.6e} (Gaussian estimate {:.6e})",
        a.theta, config.v0, report.ratio, report.gaussian_ratio
    );
    rec.write_json("franck_condon.json", &report)?;

    if let Some(n) = a.sweep {
        let rows = fc_sweep(a, n)?;
        let table = csv_bytes(&["theta [deg]", "v0 [E_R]", "ratio", "gaussian_ratio"], |w| {
            for r in &rows {
                w.write_record([num(r.0), num(r.1), num(r.2), num(r.3)])?;
            }
            Ok(())
        })?;
        rec.write("fc_sweep.csv", &table)?;
    }
    Ok(EXIT_OK)
}

fn fc_report(config: &LatticeConfig, up: &BlochSpectrum, down: &BlochSpectrum) -> Result<FcReport> {
    let fc = franck_condon(config, up, down)?;
    Ok(FcReport {
        schema: "spinlat.franck-condon.v1",
        theta_deg: config.theta.to_degrees(),
        v0: config.v0,
        depth_up: config.depth(Spin::Up),
        depth_down: config.depth(Spin::Down),
        trap_freq_up: config.trap_frequency(Spin::Up),
        bandwidth_up: up.bandwidth(0),
        bandwidth_down: down.bandwidth(0),
        omega_right: [fc.right.re, fc.right.im],
        omega_left: [fc.left.re, fc.left.im],
        ratio: fc.ratio(),
        gaussian_ratio: gaussian_fc_ratio_for(config),
    })
}

fn fc_sweep(a: &BandsArgs, n: usize) -> Result<Vec<(f64, f64, f64, f64)>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("sweep needs at least two angles, got {n}")));
    }
    (0..n)
        .map(|i| {
            let theta = a.theta + (90.0 - a.theta) * i as f64 / (n - 1) as f64;
            let config = lattice(theta, a.v0, a.trap_freq)?;
            let up = band_structure(&config, Spin::Up, a.planewaves, a.qgrid)?;
            let down = band_structure(&config, Spin::Down, a.planewaves, a.qgrid)?;
            let r = fc_report(&config, &up, &down)?;
            Ok((theta, config.v0, r.ratio, r.gaussian_ratio))
        })
        .collect()
}

fn check(cli: &Cli, a: &CheckArgs, rec: &mut Recorder) -> std::result::Result<i32, Failure> {
    let state = parse_state(&rec.read(&a.state)?)?;
    let report = reachability_check(&state, cli.tol.unwrap_or(REACHABILITY_TOL))?;
    let path = rec.write_json("reachability.json", &report)?;
    say!("{}", std::fs::read_to_string(path).map_err(Error::from)?.trim_end());
    Ok(if report.reachable { EXIT_OK } else { EXIT_UNREACHABLE })
}

fn synth(cli: &Cli, a: &SynthArgs, rec: &mut Recorder) -> std::result::Result<i32, Failure> {
    let target = parse_target(&rec.read(&a.target)?)?;
    let state = target.to_state()?;
    let report = reachability_check(&state, cli.tol.unwrap_or(REACHABILITY_TOL))?;
    if !report.reachable {
        rec.write_json("reachability.json", &report)?;
        return Err(Failure::new(
            EXIT_UNREACHABLE,
            format!(
                "target is not reachable: |<psi|T_{}|psi>| = {:.3e}",
                report.worst_j.unwrap_or(0), report.worst_magnitude
            ),
        ));
    }
    let mut compiler = PulseCompiler::ideal(a.omega_max).with_leakage(a.leakage);
    if a.mode == SynthMode::Physical {
        let config = lattice(a.theta, None, Some(a.trap_freq))?;
        let up = band_structure(&config, Spin::Up, crate::model::DEFAULT_PLANEWAVES, crate::model::DEFAULT_Q_POINTS)?;
        let down =
            band_structure(&config, Spin::Down, crate::model::DEFAULT_PLANEWAVES, crate::model::DEFAULT_Q_POINTS)?;
        let fc = franck_condon(&config, &up, &down)?;
        compiler = compiler.with_fc_weights(fc.right.norm(), fc.left.norm());
    }
    if let Some(f) = a.gradient {
        compiler = compiler.with_gradient(f, a.delta_l);
    }
    let synthesis = synthesize_unitary(&target, &compiler)?;
    let mut verification = verify_map(&synthesis.sequence, &target, &uniform_q_grid(a.qgrid))?;
    verification.rotation_count = Some(synthesis.rotations.len());

    rec.write("sequence.json", synthesis.sequence.to_json()?.as_bytes())?;
    rec.write("target_state.json", state.to_json()?.as_bytes())?;
    rec.write_json("verification.json", &verification)?;
    say!(
        "{} rotations, {} segments, total duration {:.6}, worst fidelity {:.15} at q = {:.6}",
        synthesis.rotations.len(),
        synthesis.sequence.len(),
        synthesis.sequence.total_duration(),
        verification.worst_fidelity,
        verification.worst_q
    );
    if verification.worst_fidelity < a.min_fidelity {
        return Err(Failure::new(
            EXIT_FIDELITY,
            format!(
                "worst fidelity {:.3e} below {:.3e}",
                verification.worst_fidelity, a.min_fidelity
            ),
        ));
    }
    Ok(EXIT_OK)
}

fn simulate(a: &SimulateArgs, rec: &mut Recorder) -> std::result::Result<i32, Failure> {
    let state = parse_state(&rec.read(&a.state)?)?;
    let seq = PulseSequence::from_json(&rec.read(&a.sequence)?)?;
    let chain = match (a.boundary, a.ring) {
        (_, Some(n)) => Chain::Ring(n),
        (BoundaryArg::Open, None) => Chain::Open,
        (BoundaryArg::Periodic, None) => {
            return Err(Failure::new(EXIT_INVALID, "a periodic boundary needs --ring N"));
        }
    };
    let final_state = if a.emit_trajectory {
        let states = evolve_trajectory(&state, &seq, chain)?;
        let mut times = vec![0.0];
        for seg in &seq {
            times.push(times.last().unwrap() + seg.duration);
        }
        let table = csv_bytes(
            &["segment", "time [hbar/E_R]", "site", "population_down", "population_up"],
            |w| {
                for (k, (s, t)) in states.iter().zip(&times).enumerate() {
                    for (l, down, up) in s.populations() {
                        w.write_record([k.to_string(), num(*t), l.to_string(), num(down), num(up)])?;
                    }
                }
                Ok(())
            },
        )?;
        rec.write("trajectory.csv", &table)?;
        states.last().cloned().unwrap_or(state)
    } else {
        evolve(&state, &seq, chain)?
    };
    rec.write("final_state.json", final_state.to_json()?.as_bytes())?;
    let (l, spin, p) = final_state.peak();
    say!(
        "sites {}..={}, largest population {:.15} on ({l}, {})",
        final_state.l_min(),
        final_state.l_max(),
        p,
        if spin == Spin::Up { "up" } else { "down" }
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct HnReport<'a> {
    schema: &'static str,
    chain: Chain,
    segments: usize,
    a: f64,
    b: f64,
    eta: f64,
    max_error: f64,
    tol: f64,
    agree: bool,
    schedule: &'a ScalarSchedule,
}

fn compare(cli: &Cli, a: &CompareHnArgs, rec: &mut Recorder) -> std::result::Result<i32, Failure> {
    let schedule = match &a.schedule {
        Some(path) => ScalarSchedule::from_json(&rec.read(path)?)?,
        None => {
            let max_force = if a.ring.is_some() { 0.0 } else { 1.0 };
            let s = random_scalar_schedule(&mut rng(cli.seed), a.segments, 1.0, max_force);
            rec.write("schedule.json", s.to_json()?.as_bytes())?;
            s
        }
    };
    let chain = a.ring.map_or(Chain::Open, Chain::Ring);
    let tol = cli.tol.unwrap_or(HN_TOL);
    let cmp = compare_hn(&schedule, &uniform_q_grid(a.qgrid), chain)?;
    let table = csv_bytes(
        &["q [1/L]", "analytic_re", "analytic_im", "numeric_re", "numeric_im", "abs_error"],
        |w| {
            for (i, q) in cmp.q_grid.iter().enumerate() {
                let (x, y) = (cmp.analytic[i], cmp.numeric[i]);
                w.write_record([num(*q), num(x.re), num(x.im), num(y.re), num(y.im), num((x - y).norm())])?;
            }
            Ok(())
        },
    )?;
    rec.write("hn_comparison.csv", &table)?;
    let agree = cmp.max_error < tol;
    rec.write_json(
        "hn_report.json",
        &HnReport {
            schema: "spinlat.hn-report.v1",
            chain,
            segments: schedule.segments.len(),
            a: cmp.propagator.a,
            b: cmp.propagator.b,
            eta: cmp.propagator.eta,
            max_error: cmp.max_error,
            tol,
            agree,
            schedule: &schedule,
        },
    )?;
    say!(
        "a = {:.12}, b = {:.12}, eta = {:.12}, max error {:.3e} (tol {:.1e})",
        cmp.propagator.a, cmp.propagator.b, cmp.propagator.eta, cmp.max_error, tol
    );
    if !agree {
        return Err(Failure::new(EXIT_FIDELITY, "analytic and numeric propagators disagree"));
    }
    Ok(EXIT_OK)
}
