//! Preparations compiled for ideal pair isolation, replayed on the full chain
//! where the suppressed pair still couples at 1/3500 of the driven rate.

use spinlat::control::{isolation_infidelity_estimate, synthesize_unitary, PulseCompiler};
use spinlat::dynamics::{evolve, Chain, SpinorState};
use spinlat::model::Spin;
use spinlat::random::{random_target, rng};

fn main() -> spinlat::Result<()> {
    let leakage = 1.0 / 3500.0;
    let mut r = rng(5);
    println!("sites  pulses  infidelity    first-order estimate   ratio");
    for sites in 2..=5 {
        let target = random_target(&mut r, sites);
        let ideal = target.to_state()?;
        let compiler = PulseCompiler::ideal(1.0).with_leakage(leakage);
        let synthesis = synthesize_unitary(&target, &compiler)?;
        let out = evolve(&SpinorState::basis(0, Spin::Down), &synthesis.sequence, Chain::Open)?;
        let infidelity = 1.0 - out.fidelity(&ideal);
        let estimate = isolation_infidelity_estimate(&synthesis.sequence, leakage);
        println!(
            "{sites:5}  {:6}  {infidelity:.4e}    {estimate:.4e}             {:.3}",
            synthesis.sequence.len(),
            infidelity / estimate
        );
    }
    Ok(())
}
