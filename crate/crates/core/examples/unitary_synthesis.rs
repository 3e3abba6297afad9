//! Compile translation-invariant unitaries into microwave pulses and check the
//! resulting Bloch blocks.

use spinlat::control::{synthesize_unitary, verify_map, FourierSeries, PulseCompiler, SynthesisTarget};
use spinlat::dynamics::uniform_q_grid;
use spinlat::random::{random_target, rng};

fn run(name: &str, target: &SynthesisTarget, compiler: &PulseCompiler) -> spinlat::Result<()> {
    let synthesis = synthesize_unitary(target, compiler)?;
    let report = verify_map(&synthesis.sequence, target, &uniform_q_grid(128))?;
    println!(
        "{name:<28} {:2} rotations {:2} segments  duration {:8.4}  worst infidelity {:.2e}",
        synthesis.rotations.len(),
        synthesis.sequence.len(),
        synthesis.sequence.total_duration(),
        report.infidelity()
    );
    Ok(())
}

fn main() -> spinlat::Result<()> {
    let ideal = PulseCompiler::ideal(1.0);
    run("identity", &SynthesisTarget::identity(), &ideal)?;
    run("translate by +1", &SynthesisTarget::translation(1), &ideal)?;
    run("translate by -3", &SynthesisTarget::translation(-3), &ideal)?;

    // beta(q) = (1 + e^{-i 2 pi q}) / 2, alpha(q) = (1 - e^{-i 2 pi q}) / 2
    let fourier = SynthesisTarget::Fourier {
        alpha: FourierSeries { l_min: 0, coeffs: vec![[0.5, 0.0], [-0.5, 0.0]] },
        beta: FourierSeries { l_min: 0, coeffs: vec![[0.5, 0.0], [0.5, 0.0]] },
    };
    run("two-site Fourier target", &fourier, &ideal)?;

    let mut r = rng(11);
    for sites in 1..=5 {
        run(&format!("random {sites}-site target"), &random_target(&mut r, sites), &ideal)?;
    }
    let graded = PulseCompiler::ideal(1.0).with_gradient(0.5, 0.5);
    run("random 4-site, F = 0.5", &random_target(&mut r, 4), &graded)?;
    Ok(())
}
