use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use spinlat::cli::{RunManifest, MANIFEST_FILE};
use spinlat::control::{ReachabilityReport, VerificationReport};
use spinlat::dynamics::{Coupling, PulseSequence, SpinorState};
use spinlat::model::Spin;

fn spinlat(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlat"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn state_file(dir: &Path, name: &str, state: &SpinorState) -> String {
    write(dir, name, &state.to_json().unwrap());
    name.into()
}

fn manifest(dir: &Path) -> RunManifest {
    serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_FILE)).unwrap()).unwrap()
}

#[test]
fn bands_writes_tables_and_the_fc_comparison() {
    let tmp = tempfile::tempdir().unwrap();
    let out = spinlat(tmp.path(), &["--out-dir", "o", "bands", "--theta", "90", "--qgrid", "32"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let o = tmp.path().join("o");
    for f in ["bands.csv", "wannier.csv", "potentials.csv", "franck_condon.json", MANIFEST_FILE] {
        assert!(o.join(f).exists(), "{f}");
    }
    let fc: serde_json::Value = serde_json::from_str(&fs::read_to_string(o.join("franck_condon.json")).unwrap()).unwrap();
    assert!((fc["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    let header = fs::read_to_string(o.join("bands.csv")).unwrap();
    assert!(header.starts_with("q [1/L],spin,band,energy [E_R]"));
    let m = manifest(&o);
    assert_eq!(m.command, "bands");
    assert_eq!(m.exit_code, 0);
    assert_eq!(m.outputs.len(), 4);
}

#[test]
fn bands_handles_free_particles_and_reports_bad_input() {
    let tmp = tempfile::tempdir().unwrap();
    let out = spinlat(tmp.path(), &["--out-dir", "free", "bands", "--v0", "0", "--qgrid", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let bad = spinlat(tmp.path(), &["--out-dir", "bad", "bands", "--v0", "-3"]);
    assert_eq!(bad.status.code(), Some(2));
    let unknown = spinlat(tmp.path(), &["bands", "--no-such-flag"]);
    assert_eq!(unknown.status.code(), Some(2));
    let deep = spinlat(tmp.path(), &["--out-dir", "deep", "bands", "--v0", "2000", "--planewaves", "11"]);
    assert_eq!(deep.status.code(), Some(3));
}

#[test]
fn check_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let ket = state_file(d, "ket.json", &SpinorState::basis(2, Spin::Up));
    assert_eq!(spinlat(d, &["--out-dir", "a", "check", &ket]).status.code(), Some(0));

    write(d, "pair.json", r#"{"schema":"spinlat.spinor-state.v1","l_min":0,"amps":[[0.7071067811865476,0,0,0],[0.7071067811865476,0,0,0]]}"#);
    let out = spinlat(d, &["--out-dir", "b", "check", "pair.json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: ReachabilityReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.worst_j, Some(1));

    write(d, "junk.json", "{");
    assert_eq!(spinlat(d, &["--out-dir", "c", "check", "junk.json"]).status.code(), Some(2));
    assert_eq!(spinlat(d, &["--out-dir", "c", "check", "missing.json"]).status.code(), Some(2));
}

#[test]
fn synth_translation_gives_two_pi_pulses() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "t.json", r#"{"form":"wannier","state":{"schema":"spinlat.spinor-state.v1","l_min":1,"amps":[[1,0,0,0]]}}"#);
    let out = spinlat(d, &["--out-dir", "s", "synth", "t.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let seq = PulseSequence::from_json(&fs::read_to_string(d.join("s/sequence.json")).unwrap()).unwrap();
    let modes: Vec<Coupling> = seq.iter().map(|s| s.coupling).collect();
    assert_eq!(modes, vec![Coupling::R, Coupling::L]);
    let v: VerificationReport = serde_json::from_str(&fs::read_to_string(d.join("s/verification.json")).unwrap()).unwrap();
    assert!(v.worst_fidelity > 1.0 - 1e-12);
    assert_eq!(v.per_q.len(), 128);
    assert_eq!(v.rotation_count, Some(2));
}

#[test]
fn synth_identity_and_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let id = state_file(d, "id.json", &SpinorState::basis(0, Spin::Down));
    assert_eq!(spinlat(d, &["--out-dir", "i", "synth", &id]).status.code(), Some(0));
    let seq = PulseSequence::from_json(&fs::read_to_string(d.join("i/sequence.json")).unwrap()).unwrap();
    assert!(seq.is_empty());

    write(d, "pair.json", r#"{"schema":"spinlat.spinor-state.v1","l_min":0,"amps":[[0.7071067811865476,0,0,0],[0.7071067811865476,0,0,0]]}"#);
    assert_eq!(spinlat(d, &["--out-dir", "u", "synth", "pair.json"]).status.code(), Some(1));

    let target = spinlat::random::random_reachable_state(&mut spinlat::random::rng(1), 3);
    let t = state_file(d, "t.json", &target);
    let leaky = spinlat(d, &["--out-dir", "l", "synth", &t, "--leakage", "0.05"]);
    assert_eq!(leaky.status.code(), Some(4));
    assert_eq!(manifest(&d.join("l")).exit_code, 4);
}

#[test]
fn synth_physical_mode_and_gradient() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let target = spinlat::random::random_reachable_state(&mut spinlat::random::rng(2), 3);
    let t = state_file(d, "t.json", &target);
    let out = spinlat(d, &["--out-dir", "p", "synth", &t, "--mode", "physical", "--qgrid", "32"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let seq = PulseSequence::from_json(&fs::read_to_string(d.join("p/sequence.json")).unwrap()).unwrap();
    // the right pair is hundreds of times weaker at 80 degrees
    let r = seq.iter().filter(|s| s.coupling == Coupling::R).map(|s| s.duration).fold(0.0, f64::max);
    let l = seq.iter().filter(|s| s.coupling == Coupling::L).map(|s| s.duration).fold(0.0, f64::max);
    assert!(r > 100.0 * l.min(1.0), "{r} {l}");

    let out = spinlat(d, &["--out-dir", "g", "synth", &t, "--gradient", "0.5", "--qgrid", "32"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simulate_round_trip_and_trajectory() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let target = spinlat::random::random_reachable_state(&mut spinlat::random::rng(3), 5);
    let t = state_file(d, "target.json", &target);
    assert_eq!(spinlat(d, &["--out-dir", "s", "synth", &t]).status.code(), Some(0));
    let ket = state_file(d, "ket.json", &SpinorState::basis(0, Spin::Down));
    let out = spinlat(d, &["--out-dir", "m", "simulate", &ket, "s/sequence.json", "--emit-trajectory"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let fin = SpinorState::from_json(&fs::read_to_string(d.join("m/final_state.json")).unwrap()).unwrap();
    assert!(fin.fidelity(&target) > 1.0 - 1e-10);
    let traj = fs::read_to_string(d.join("m/trajectory.csv")).unwrap();
    assert!(traj.starts_with("segment,time [hbar/E_R],site,population_down,population_up"));

    write(d, "empty.json", r#"{"schema":"spinlat.pulse-sequence.v1","segments":[]}"#);
    assert_eq!(spinlat(d, &["--out-dir", "e", "simulate", &t, "empty.json"]).status.code(), Some(0));
    assert_eq!(fs::read_to_string(d.join("e/final_state.json")).unwrap(), target.to_json().unwrap());

    assert_eq!(spinlat(d, &["--out-dir", "r", "simulate", &t, "empty.json", "--boundary", "periodic"]).status.code(), Some(2));
    assert_eq!(spinlat(d, &["--out-dir", "r", "simulate", &t, "empty.json", "--ring", "8"]).status.code(), Some(0));
}

#[test]
fn simulate_reports_leakage() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let ket = state_file(d, "ket.json", &SpinorState::basis(0, Spin::Down));
    let seq = PulseSequence::new(vec![spinlat::dynamics::ControlSegment::both(1.0, 1.0, 0.0, 3000.0)]);
    write(d, "long.json", &seq.to_json().unwrap());
    assert_eq!(spinlat(d, &["--out-dir", "x", "simulate", &ket, "long.json"]).status.code(), Some(3));
}

#[test]
fn compare_hn_agrees_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let a = spinlat(d, &["--out-dir", "a", "--seed", "42", "compare-hn"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = spinlat(d, &["--out-dir", "b", "--seed", "42", "compare-hn"]);
    assert_eq!(b.status.code(), Some(0));
    let (ma, mb) = (manifest(&d.join("a")), manifest(&d.join("b")));
    let digests = |m: &RunManifest| m.outputs.iter().map(|f| f.sha256.clone()).collect::<Vec<_>>();
    assert_eq!(digests(&ma), digests(&mb));

    let ring = spinlat(d, &["--out-dir", "r", "compare-hn", "--ring", "64"]);
    assert_eq!(ring.status.code(), Some(0));
    let forced = spinlat(d, &["--out-dir", "f", "compare-hn", "a/schedule.json", "--ring", "64"]);
    assert_eq!(forced.status.code(), Some(2));

    write(d, "still.json", r#"{"schema":"spinlat.scalar-schedule.v1","segments":[{"duration":1.0,"hopping":0.0,"force":0.3}]}"#);
    assert_eq!(spinlat(d, &["--out-dir", "z", "compare-hn", "still.json"]).status.code(), Some(0));
    let impossible = spinlat(d, &["--out-dir", "t", "--tol", "0", "compare-hn"]);
    assert_eq!(impossible.status.code(), Some(4));
}

#[test]
fn emitted_json_reemits_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let target = spinlat::random::random_reachable_state(&mut spinlat::random::rng(4), 4);
    let t = state_file(d, "t.json", &target);
    assert_eq!(spinlat(d, &["--out-dir", "s", "synth", &t, "--qgrid", "16"]).status.code(), Some(0));
    let text = fs::read_to_string(d.join("s/sequence.json")).unwrap();
    assert_eq!(PulseSequence::from_json(&text).unwrap().to_json().unwrap(), text);
    let text = fs::read_to_string(d.join("s/verification.json")).unwrap();
    let v: VerificationReport = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&v).unwrap();
    again.push('\n');
    assert_eq!(again, text);
}
